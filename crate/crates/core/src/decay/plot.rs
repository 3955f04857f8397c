use std::path::Path;

use plotters::prelude::*;

use crate::error::{Error, Result};

/// One measured curve and, optionally, a theory slope anchored at its
/// first sample inside `window`.
pub struct PlotSeries<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
    pub theory_exponent: Option<f64>,
    pub window: [f64; 2],
}

fn plot_err(e: impl std::fmt::Display) -> Error {
    Error::Config(format!("plot: {e}"))
}

/// Log-log plot of positive samples with `t > 0`.
pub fn write_loglog_svg(path: &Path, title: &str, series: &[PlotSeries<'_>]) -> Result<()> {
    let pos = |(t, v): &&(f64, f64)| *t > 0.0 && *v > 0.0 && v.is_finite();
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().filter(pos).copied())
        .collect();
    if all.is_empty() {
        return Err(Error::param("series", "nothing positive to plot"));
    }
    let (t0, t1) = all.iter().fold((f64::INFINITY, 0.0f64), |(a, b), (t, _)| {
        (a.min(*t), b.max(*t))
    });
    let (v0, v1) = all.iter().fold((f64::INFINITY, 0.0f64), |(a, b), (_, v)| {
        (a.min(*v), b.max(*v))
    });
    let root = SVGBackend::new(path, (800, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(
            (t0..t1 * 1.01).log_scale(),
            (v0 * 0.9..v1 * 1.1).log_scale(),
        )
        .map_err(plot_err)?;
    chart
        .configure_mesh()
        .x_desc("t")
        .y_desc("norm")
        .draw()
        .map_err(plot_err)?;
    for (i, s) in series.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        let pts: Vec<(f64, f64)> = s.points.iter().filter(pos).copied().collect();
        chart
            .draw_series(LineSeries::new(pts.clone(), color.stroke_width(2)))
            .map_err(plot_err)?
            .label(s.label)
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], color));
        if let (Some(k), Some(&(ta, va))) = (
            s.theory_exponent,
            pts.iter().find(|(t, _)| *t >= s.window[0]),
        ) {
            let line: Vec<(f64, f64)> = pts
                .iter()
                .filter(|(t, _)| *t >= ta && *t <= s.window[1])
                .map(|&(t, _)| {
                    let ratio = ((1.0 + t * t) / (1.0 + ta * ta)).sqrt();
                    (t, va * ratio.powf(k))
                })
                .collect();
            chart
                .draw_series(LineSeries::new(line, color.stroke_width(1)))
                .map_err(plot_err)?;
        }
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}
