use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 56.0;

const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

fn extent(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = vals.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.04 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

/// Scatter plot, one colour per series. `header` is emitted verbatim after
/// the XML prolog.
pub fn scatter(header: &str, title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let (x0, x1) = extent(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y0, y1) = extent(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut s = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(header);
    writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">").unwrap();
    writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>").unwrap();
    writeln!(
        s,
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        W - 2.0 * PAD,
        H - 2.0 * PAD
    )
    .unwrap();
    writeln!(s, "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>", W / 2.0, escape(title)).unwrap();
    writeln!(s, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>", W / 2.0, H - 12.0, escape(xlabel))
        .unwrap();
    writeln!(
        s,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 {})\">{}</text>",
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    )
    .unwrap();
    for (v, anchor, x, y) in [
        (x0, "start", PAD, H - PAD + 16.0),
        (x1, "end", W - PAD, H - PAD + 16.0),
    ] {
        writeln!(s, "<text x=\"{x}\" y=\"{y}\" text-anchor=\"{anchor}\" font-size=\"11\">{v:.4}</text>").unwrap();
    }
    for (v, y) in [(y0, H - PAD), (y1, PAD + 10.0)] {
        writeln!(s, "<text x=\"{}\" y=\"{y}\" text-anchor=\"end\" font-size=\"11\">{v:.3e}</text>", PAD - 4.0).unwrap();
    }
    for (i, ser) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        writeln!(s, "<g fill=\"{colour}\">").unwrap();
        for &(x, y) in &ser.points {
            if x.is_finite() && y.is_finite() {
                writeln!(s, "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\"/>", sx(x), sy(y)).unwrap();
            }
        }
        writeln!(s, "</g>").unwrap();
        let ly = PAD + 16.0 + 16.0 * i as f64;
        writeln!(
            s,
            "<text x=\"{}\" y=\"{ly}\" text-anchor=\"end\" font-size=\"11\" fill=\"{colour}\">{}</text>",
            W - PAD - 6.0,
            escape(&ser.label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
