use std::fmt::Write;

use crate::evaluate::SweepCurve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// Which metric to plot alongside balanced accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondaryMetric {
    DiError,
    AverageOddsDifference,
}

impl SecondaryMetric {
    fn label(self) -> &'static str {
        match self {
            SecondaryMetric::DiError => "disparate impact error",
            SecondaryMetric::AverageOddsDifference => "average odds difference",
        }
    }

    fn series(self, curve: &SweepCurve) -> &[Option<f64>] {
        match self {
            SecondaryMetric::DiError => &curve.di_error,
            SecondaryMetric::AverageOddsDifference => &curve.average_odds_difference,
        }
    }
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

struct Plane {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Plane {
    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

/// Appends one series as polyline segments, breaking where values are absent.
fn polylines(out: &mut String, plane: &Plane, xs: &[f64], ys: &[Option<f64>], color: &str) {
    let mut segment: Vec<(f64, f64)> = Vec::new();
    let flush = |seg: &mut Vec<(f64, f64)>, out: &mut String| {
        if seg.len() >= 2 {
            let points: Vec<String> = seg
                .iter()
                .map(|(x, y)| format!("{:.2},{:.2}", plane.x(*x), plane.y(*y)))
                .collect();
            writeln!(
                out,
                "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                points.join(" ")
            )
            .unwrap();
        } else if seg.len() == 1 {
            let (x, y) = seg[0];
            writeln!(
                out,
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{color}\"/>",
                plane.x(x),
                plane.y(y)
            )
            .unwrap();
        }
        seg.clear();
    };
    for (&x, y) in xs.iter().zip(ys) {
        match y {
            Some(v) => segment.push((x, *v)),
            None => flush(&mut segment, out),
        }
    }
    flush(&mut segment, out);
}

/// Renders a threshold-sweep chart for one fold as an SVG 1.1 document:
/// balanced accuracy plus one secondary metric against the candidate
/// thresholds, with a dotted vertical marker at the chosen threshold.
pub fn fold_chart(curve: &SweepCurve, chosen_threshold: f64, secondary: SecondaryMetric) -> String {
    let secondary_values = secondary.series(curve);
    let mut y_min: f64 = 0.0;
    let mut y_max: f64 = 1.0;
    for v in curve
        .balanced_accuracy
        .iter()
        .chain(secondary_values)
        .flatten()
    {
        y_min = y_min.min(*v);
        y_max = y_max.max(*v);
    }
    let pad = 0.05 * (y_max - y_min);
    let plane = Plane {
        x_min: *curve.thresholds.first().unwrap_or(&0.0),
        x_max: *curve.thresholds.last().unwrap_or(&1.0),
        y_min: y_min - pad,
        y_max: y_max + pad,
    };

    let mut out = String::new();
    writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>").unwrap();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )
    .unwrap();
    writeln!(out, "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>").unwrap();

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    writeln!(
        out,
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>"
    )
    .unwrap();
    writeln!(
        out,
        "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>"
    )
    .unwrap();

    // x ticks at 0.2 steps inside the data range
    let mut tick = (plane.x_min / 0.2).ceil() * 0.2;
    while tick <= plane.x_max + 1e-9 {
        let px = plane.x(tick);
        writeln!(
            out,
            "  <line x1=\"{px:.2}\" y1=\"{y0}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"black\"/>",
            y0 + 4.0
        )
        .unwrap();
        writeln!(
            out,
            "  <text x=\"{px:.2}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{tick:.1}</text>",
            y0 + 18.0
        )
        .unwrap();
        tick += 0.2;
    }
    // y ticks at quartiles of the plotted range
    for i in 0..=4 {
        let v = plane.y_min + (plane.y_max - plane.y_min) * i as f64 / 4.0;
        let py = plane.y(v);
        writeln!(
            out,
            "  <line x1=\"{}\" y1=\"{py:.2}\" x2=\"{x0}\" y2=\"{py:.2}\" stroke=\"black\"/>",
            x0 - 4.0
        )
        .unwrap();
        writeln!(
            out,
            "  <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{v:.2}</text>",
            x0 - 8.0,
            py + 4.0
        )
        .unwrap();
    }

    polylines(&mut out, &plane, &curve.thresholds, &curve.balanced_accuracy, "#1f77b4");
    polylines(&mut out, &plane, &curve.thresholds, secondary_values, "#d62728");

    // chosen threshold marker
    let cx = plane.x(chosen_threshold);
    writeln!(
        out,
        "  <line x1=\"{cx:.2}\" y1=\"{y0}\" x2=\"{cx:.2}\" y2=\"{y1}\" stroke=\"#444444\" stroke-dasharray=\"3,4\"/>"
    )
    .unwrap();

    // legend and labels
    writeln!(
        out,
        "  <text x=\"{x0}\" y=\"{}\" font-size=\"12\" fill=\"#1f77b4\">balanced accuracy</text>",
        y1 - 20.0
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#d62728\">{}</text>",
        x0 + 160.0,
        y1 - 20.0,
        xml_escape(secondary.label())
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#444444\">threshold = {chosen_threshold}</text>",
        x0 + 360.0,
        y1 - 20.0
    )
    .unwrap();
    writeln!(
        out,
        "  <text x=\"{:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">classification threshold</text>",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0
    )
    .unwrap();

    writeln!(out, "</svg>").unwrap();
    out
}
