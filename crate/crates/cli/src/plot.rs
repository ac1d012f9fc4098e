//! Static SVG charts.

use plotters::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mark {
    Line,
    Dots,
    /// Vertical bars from the bottom of the chart, of the given width in x units.
    Bars(f64),
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub mark: Mark,
}

impl Series {
    pub fn new(label: impl Into<String>, mark: Mark, points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let points = points.into_iter().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
        Series { label: label.into(), points, mark }
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_desc: String,
    pub y_desc: String,
    pub series: Vec<Series>,
}

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
    RGBColor(255, 127, 14),
    RGBColor(127, 127, 127),
];

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
    (lo - 0.05 * span, hi + 0.05 * span)
}

impl Chart {
    pub fn new(title: impl Into<String>, x_desc: impl Into<String>, y_desc: impl Into<String>) -> Self {
        Chart { title: title.into(), x_desc: x_desc.into(), y_desc: y_desc.into(), series: Vec::new() }
    }

    pub fn with(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    pub fn render(&self) -> String {
        let pts = self.series.iter().flat_map(|s| s.points.iter());
        let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
        let bar_half = self
            .series
            .iter()
            .filter_map(|s| if let Mark::Bars(w) = s.mark { Some(w) } else { None })
            .fold(0.0, f64::max);
        if bar_half > 0.0 {
            y_lo = y_lo.min(0.0);
        }
        let (x_lo, x_hi) = padded(x_lo - bar_half, x_hi + bar_half);
        let (y_lo, y_hi) = padded(y_lo, y_hi);
        let mut out = String::new();
        {
            let root = SVGBackend::with_string(&mut out, (720, 440)).into_drawing_area();
            root.fill(&WHITE).expect("in-memory backend");
            let mut chart = ChartBuilder::on(&root)
                .caption(&self.title, ("sans-serif", 18))
                .margin(12)
                .x_label_area_size(36)
                .y_label_area_size(56)
                .build_cartesian_2d(x_lo..x_hi, y_lo..y_hi)
                .expect("finite ranges");
            chart
                .configure_mesh()
                .x_desc(&self.x_desc)
                .y_desc(&self.y_desc)
                .draw()
                .expect("in-memory backend");
            for (i, s) in self.series.iter().enumerate() {
                let color = PALETTE[i % PALETTE.len()];
                let drawn = match s.mark {
                    Mark::Line => chart.draw_series(LineSeries::new(s.points.iter().copied(), color.stroke_width(2))),
                    Mark::Dots => chart.draw_series(s.points.iter().map(|&p| Circle::new(p, 3, color.filled()))),
                    Mark::Bars(w) => chart.draw_series(s.points.iter().map(|&(x, y)| {
                        Rectangle::new([(x - w / 2.0, y_lo.max(0.0).min(y)), (x + w / 2.0, y)], color.mix(0.7).filled())
                    })),
                }
                .expect("in-memory backend");
                drawn
                    .label(s.label.clone())
                    .legend(move |(x, y)| Rectangle::new([(x, y - 4), (x + 12, y + 4)], color.filled()));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .expect("in-memory backend");
            root.present().expect("in-memory backend");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_all_marks() {
        let svg = Chart::new("demo", "x", "y")
            .with(Series::new("line", Mark::Line, [(0.0, 1.0), (1.0, 2.0)]))
            .with(Series::new("dots", Mark::Dots, [(0.5, 1.5), (f64::NAN, 0.0)]))
            .with(Series::new("bars", Mark::Bars(0.2), [(0.0, 1.0)]))
            .render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("demo") && svg.contains("bars"));
    }

    #[test]
    fn empty_chart_still_renders() {
        assert!(Chart::new("empty", "x", "y").render().contains("</svg>"));
    }
}
