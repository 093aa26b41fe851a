//! Self-contained SVG renderings of the figures. Coordinates are printed with two decimals
//! so identical inputs give identical bytes.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{Pow, ToPrimitive};

use crate::cantor::{cantor_level, TernaryRational};
use crate::dynamics::visibility::forward_links;
use crate::error::Result;
use crate::polygon::{circle_point, generation};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

fn colour(index: u32) -> &'static str {
    PALETTE[(index.saturating_sub(1) as usize) % PALETTE.len()]
}

struct Svg {
    width: f64,
    height: f64,
    body: String,
}

impl Svg {
    fn new(width: f64, height: f64, title: &str) -> Self {
        let mut body = String::new();
        writeln!(body, "<title>{}</title>", escape(title)).unwrap();
        writeln!(
            body,
            "<rect x=\"0\" y=\"0\" width=\"{width:.2}\" height=\"{height:.2}\" fill=\"#ffffff\"/>"
        )
        .unwrap();
        Self {
            width,
            height,
            body,
        }
    }

    fn line(&mut self, class: &str, (x1, y1): (f64, f64), (x2, y2): (f64, f64), extra: &str) {
        writeln!(
            self.body,
            "<line class=\"{class}\" x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"{extra}/>"
        )
        .unwrap();
    }

    fn rect(&mut self, class: &str, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        writeln!(
            self.body,
            "<rect class=\"{class}\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\"/>"
        )
        .unwrap();
    }

    fn circle(&mut self, class: &str, (cx, cy): (f64, f64), r: f64, fill: &str) {
        writeln!(
            self.body,
            "<circle class=\"{class}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"{fill}\"/>"
        )
        .unwrap();
    }

    fn text(&mut self, (x, y): (f64, f64), anchor: &str, size: f64, content: &str) {
        writeln!(
            self.body,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" font-size=\"{size:.2}\" font-family=\"sans-serif\">{}</text>",
            escape(content)
        )
        .unwrap();
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">\n\
             {body}</svg>\n",
            w = self.width,
            h = self.height,
            body = self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One vertical tick per term, height proportional to the term, with a dot on top.
pub fn ruler_svg(terms: &[u32]) -> String {
    const MARGIN: f64 = 30.0;
    const SPACING: f64 = 4.0;
    const UNIT: f64 = 20.0;
    let max = terms.iter().copied().max().unwrap_or(1) as f64;
    let width = 2.0 * MARGIN + SPACING * terms.len().saturating_sub(1) as f64;
    let height = 2.0 * MARGIN + UNIT * max;
    let baseline = height - MARGIN;
    let mut svg = Svg::new(
        width,
        height,
        &format!("ruler sequence, first {} terms", terms.len()),
    );
    svg.line(
        "axis",
        (MARGIN, baseline),
        (width - MARGIN, baseline),
        " stroke=\"#000000\" stroke-width=\"0.5\"",
    );
    for (i, &t) in terms.iter().enumerate() {
        let x = MARGIN + SPACING * i as f64;
        let top = baseline - UNIT * t as f64;
        svg.line(
            "tick",
            (x, baseline),
            (x, top),
            &format!(
                " stroke=\"#000000\" stroke-width=\"1\" data-position=\"{}\" data-term=\"{t}\"",
                i + 1
            ),
        );
        svg.circle("point", (x, top), 1.5, colour(t));
    }
    svg.finish()
}

/// Age pyramid: one centred bar per age class, age 1 at the bottom, width proportional to
/// the share given for that age.
pub fn pyramid_svg(shares: &[(u32, f64)], title: &str) -> String {
    const BAR: f64 = 24.0;
    const GAP: f64 = 4.0;
    const FULL: f64 = 800.0;
    const MARGIN: f64 = 40.0;
    let width = FULL + 2.0 * MARGIN + 160.0;
    let height = 2.0 * MARGIN + shares.len() as f64 * (BAR + GAP);
    let centre = MARGIN + 80.0 + FULL / 2.0;
    let mut svg = Svg::new(width, height, title);
    for (row, &(age, share)) in shares.iter().enumerate() {
        let y = height - MARGIN - (row as f64 + 1.0) * (BAR + GAP);
        let w = FULL * share;
        svg.rect("bar", centre - w / 2.0, y, w, BAR, colour(age));
        svg.text(
            (MARGIN + 60.0, y + BAR * 0.7),
            "end",
            12.0,
            &format!("age {age}"),
        );
        svg.text(
            (centre + w / 2.0 + 6.0, y + BAR * 0.7),
            "start",
            12.0,
            &super::report::format_real(share),
        );
    }
    svg.text((centre, MARGIN * 0.6), "middle", 14.0, title);
    svg.finish()
}

fn ternary_f64(t: &TernaryRational) -> f64 {
    let den = BigUint::from(3u32).pow(t.exponent());
    t.numerator().to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN)
}

/// Levels `1..=n` of the Cantor construction stacked top to bottom; removed middle thirds are
/// coloured by index and labelled when wide enough.
pub fn cantor_svg(n: u32) -> Result<String> {
    const WIDTH: f64 = 810.0;
    const MARGIN: f64 = 40.0;
    const ROW: f64 = 50.0;
    let height = 2.0 * MARGIN + ROW * n as f64;
    let mut svg = Svg::new(
        WIDTH + 2.0 * MARGIN + 60.0,
        height,
        &format!("Cantor middle intervals, levels 1 to {n}"),
    );
    for step in 1..=n {
        let level = cantor_level(step)?;
        let y = MARGIN + ROW * (step as f64 - 0.5);
        svg.text((MARGIN * 0.8, y + 4.0), "end", 12.0, &format!("C{step}"));
        svg.rect("closed", MARGIN, y - 3.0, WIDTH, 6.0, "#000000");
        for iv in &level.intervals {
            let x0 = MARGIN + WIDTH * ternary_f64(&iv.lo);
            let x1 = MARGIN + WIDTH * ternary_f64(&iv.hi);
            svg.rect("middle", x0, y - 4.0, x1 - x0, 8.0, colour(iv.index));
            if x1 - x0 >= 8.0 {
                svg.text(
                    ((x0 + x1) / 2.0, y - 8.0),
                    "middle",
                    10.0,
                    &iv.index.to_string(),
                );
            }
        }
        svg.text(
            (MARGIN + WIDTH + 8.0, y + 4.0),
            "start",
            10.0,
            &format!("n={step}"),
        );
    }
    Ok(svg.finish())
}

/// Nested 2^m-gons for `m = 1..=n` with the generation-`n` vertex indices written outside
/// the circle. The southernmost vertex is drawn hollow and left unlabelled.
pub fn polygon_svg(n: u32) -> Result<String> {
    const RADIUS: f64 = 200.0;
    const SIZE: f64 = 2.0 * RADIUS + 120.0;
    let centre = SIZE / 2.0;
    let to_screen = |angle: f64, radius: f64| {
        let (x, y) = circle_point(angle);
        (centre + radius * x, centre - radius * y)
    };
    let g = generation(n)?;
    let mut svg = Svg::new(SIZE, SIZE, &format!("nested 2^m-gons, m = 1 to {n}"));
    writeln!(
        svg.body,
        "<circle class=\"circle\" cx=\"{centre:.2}\" cy=\"{centre:.2}\" r=\"{RADIUS:.2}\" fill=\"none\" stroke=\"#cccccc\"/>"
    )
    .unwrap();
    for m in 1..=n {
        let sides = 1u64 << m;
        let points: Vec<String> = (0..sides)
            .map(|j| {
                let (x, y) = to_screen(TAU * j as f64 / sides as f64, RADIUS);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(
            svg.body,
            "<polygon class=\"gon\" data-sides=\"{sides}\" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\"/>",
            points.join(" "),
            colour(n - m + 1)
        )
        .unwrap();
    }
    let south = to_screen(0.0, RADIUS);
    writeln!(
        svg.body,
        "<circle class=\"south\" cx=\"{:.2}\" cy=\"{:.2}\" r=\"4.00\" fill=\"#ffffff\" stroke=\"#000000\"/>",
        south.0, south.1
    )
    .unwrap();
    for v in &g.vertices {
        let index = v.index();
        svg.circle("vertex", to_screen(v.angle(), RADIUS), 3.0, colour(index));
        let (lx, ly) = to_screen(v.angle(), RADIUS + 18.0);
        svg.text((lx, ly + 4.0), "middle", 11.0, &index.to_string());
    }
    Ok(svg.finish())
}

/// Bars for a time series with the forward horizontal visibility links of the points in
/// `window`, each labelled with its degree.
pub fn visibility_svg(
    series: &[f64],
    window: std::ops::Range<usize>,
    degrees: &[u32],
    title: &str,
) -> String {
    const MARGIN: f64 = 40.0;
    const STEP: f64 = 24.0;
    const TALL: f64 = 300.0;
    let width = 2.0 * MARGIN + STEP * series.len().saturating_sub(1) as f64;
    let height = 2.0 * MARGIN + TALL;
    let baseline = height - MARGIN;
    let x_of = |i: usize| MARGIN + STEP * i as f64;
    let y_of = |v: f64| baseline - TALL * v;
    let mut svg = Svg::new(width, height, title);
    for (i, &v) in series.iter().enumerate() {
        let measured = window.contains(&i);
        let stroke = if measured { "#000000" } else { "#999999" };
        svg.line(
            "bar",
            (x_of(i), baseline),
            (x_of(i), y_of(v)),
            &format!(" stroke=\"{stroke}\" stroke-width=\"3\""),
        );
    }
    for (i, &d) in window.clone().zip(degrees) {
        for j in forward_links(series, i) {
            let level = series[i].min(series[j]);
            svg.line(
                "link",
                (x_of(i), y_of(level)),
                (x_of(j), y_of(level)),
                " stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"3,2\"",
            );
        }
        svg.text((x_of(i), baseline + 16.0), "middle", 11.0, &d.to_string());
    }
    svg.text((width / 2.0, MARGIN * 0.6), "middle", 14.0, title);
    svg.finish()
}
