//! Minimal hand-rolled SVG plots: no plotting dependency.

use extremogram::estimators::ExtremogramResult;
use extremogram::spectral::SpectralEstimate;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 45.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn document(title: &str, frame: &Frame, body: &str) -> String {
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = WIDTH,
        h = HEIGHT
    ));
    svg.push_str(&format!(
        "<title>{}</title>\n",
        xml_escape(title)
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n",
        WIDTH, HEIGHT
    ));
    // axes
    let x0 = frame.x(frame.x_min);
    let x1 = frame.x(frame.x_max);
    let y0 = frame.y(frame.y_min);
    let y1 = frame.y(frame.y_max);
    svg.push_str(&format!(
        "<line class=\"axis\" x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<line class=\"axis\" x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        18.0,
        xml_escape(title)
    ));
    svg.push_str(body);
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn axis_labels(frame: &Frame, x_name: &str, y_name: &str) -> String {
    let mut out = String::new();
    for i in 0..=4 {
        let v = frame.y_min + (frame.y_max - frame.y_min) * i as f64 / 4.0;
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"end\">{:.3}</text>\n",
            MARGIN_LEFT - 6.0,
            frame.y(v) + 4.0,
            v
        ));
    }
    for i in 0..=4 {
        let v = frame.x_min + (frame.x_max - frame.x_min) * i as f64 / 4.0;
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{:.0}</text>\n",
            frame.x(v),
            HEIGHT - MARGIN_BOTTOM + 16.0,
            v
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 8.0,
        xml_escape(x_name)
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        14.0,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        (MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0,
        xml_escape(y_name)
    ));
    out
}

/// Stem plot of an extremogram with its baseline and optional bands.
/// Exactly one `class="stem"` line per lag.
pub fn render_extremogram(result: &ExtremogramResult, title: &str) -> String {
    let max_lag = *result.lags.last().unwrap_or(&0) as f64;
    let mut y_max: f64 = 1.0;
    if let Some(hi) = &result.band_hi {
        y_max = hi.iter().copied().fold(y_max, f64::max);
    }
    y_max = result.rho.iter().copied().fold(y_max, f64::max) * 1.05;
    let mut y_min: f64 = 0.0;
    if let Some(lo) = &result.band_lo {
        y_min = lo.iter().copied().fold(0.0f64, f64::min);
    }
    let frame = Frame {
        x_min: -0.5,
        x_max: max_lag + 0.5,
        y_min,
        y_max,
    };

    let mut body = String::new();
    // confidence band as a translucent polygon
    if let (Some(lo), Some(hi)) = (&result.band_lo, &result.band_hi) {
        let mut points = String::new();
        for (i, &lag) in result.lags.iter().enumerate() {
            points.push_str(&format!("{:.2},{:.2} ", frame.x(lag as f64), frame.y(hi[i])));
        }
        for (i, &lag) in result.lags.iter().enumerate().rev() {
            points.push_str(&format!("{:.2},{:.2} ", frame.x(lag as f64), frame.y(lo[i])));
        }
        body.push_str(&format!(
            "<polygon class=\"band\" points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.45\" stroke=\"none\"/>\n",
            points.trim_end()
        ));
    }
    // independence baseline
    body.push_str(&format!(
        "<line class=\"baseline\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#d62728\" stroke-dasharray=\"6 3\"/>\n",
        frame.x(frame.x_min),
        frame.y(result.baseline),
        frame.x(frame.x_max),
        frame.y(result.baseline)
    ));
    // stems
    let y_zero = frame.y(0.0);
    for (i, &lag) in result.lags.iter().enumerate() {
        let x = frame.x(lag as f64);
        let y = frame.y(result.rho[i]);
        body.push_str(&format!(
            "<line class=\"stem\" x1=\"{x:.2}\" y1=\"{y_zero:.2}\" x2=\"{x:.2}\" y2=\"{y:.2}\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
        ));
        body.push_str(&format!(
            "<circle class=\"stem-head\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.5\" fill=\"#1f77b4\"/>\n"
        ));
    }
    body.push_str(&axis_labels(&frame, "lag", "rho"));
    document(title, &frame, &body)
}

/// Line plot of a spectral density estimate.
pub fn render_spectrum(est: &SpectralEstimate, title: &str) -> String {
    let y_max = est.values.iter().copied().fold(f64::MIN, f64::max);
    let y_min = est.values.iter().copied().fold(0.0f64, f64::min);
    let frame = Frame {
        x_min: 0.0,
        x_max: std::f64::consts::PI,
        y_min,
        y_max: y_max * 1.05 + 1e-12,
    };
    let mut points = String::new();
    for (l, v) in est.frequencies.iter().zip(&est.values) {
        points.push_str(&format!("{:.2},{:.2} ", frame.x(*l), frame.y(*v)));
    }
    let mut body = format!(
        "<polyline class=\"density\" points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
        points.trim_end()
    );
    body.push_str(&axis_labels(&frame, "lambda", "f_hat"));
    document(title, &frame, &body)
}
