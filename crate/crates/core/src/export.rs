//! Deterministic CSV/JSON/SVG artifact writers.
//!
//! Every artifact is a pure function of the data: fixed column orders,
//! floats printed with 17 significant digits (`{:.16e}`), struct-ordered
//! JSON, and SVG built from sorted inputs — identical runs produce
//! byte-identical files. Infinite resolvent norms print as `inf` in CSV;
//! JSON renders them as `null` (a serde_json limitation worth knowing
//! when post-processing pseudospectrum tables).
//!
//! The SVG output is a static scatter in the z-plane: resonance targets
//! as crosses, stable eigenvalues as per-ε colored dots, with the real
//! and imaginary axes and the sector edge `arg z = −π/4` drawn for
//! orientation. Presentation only — no scripting, no interactivity.

use crate::eigensolver::Spectrum;
use crate::harness::{ConvergenceReport, PseudospectrumTable};
use crate::resonance::ResonanceSet;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Artifact I/O failures, always carrying the offending path.
#[derive(Debug, Error)]
pub enum ExportError {
    #[error("failed to write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to encode or decode {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

/// A spectrum tagged with the parameters that produced it — the
/// self-contained JSON document emitted by single-solve commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub epsilon: f64,
    pub alpha: f64,
    pub spectrum: Spectrum,
}

/// 17-significant-digit float, the repository-wide CSV number format.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV of spectra: `epsilon,alpha,index,re_z,im_z,residual,stable`,
/// one row per eigenvalue, documents in the given order. An empty slice
/// or empty spectra produce the header alone.
pub fn spectra_csv(documents: &[SpectrumDocument]) -> String {
    let mut out = String::from("epsilon,alpha,index,re_z,im_z,residual,stable\n");
    for doc in documents {
        for (index, &z) in doc.spectrum.eigenvalues.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt(doc.epsilon),
                fmt(doc.alpha),
                index,
                fmt(z.re),
                fmt(z.im),
                fmt(doc.spectrum.residuals[index]),
                doc.spectrum.stable[index],
            ));
        }
    }
    out
}

/// CSV of a resonance set:
/// `re_k,im_k,re_z,im_z,multiplicity,certified,kind`.
pub fn resonances_csv(set: &ResonanceSet) -> String {
    let mut out = String::from("re_k,im_k,re_z,im_z,multiplicity,certified,kind\n");
    for pole in &set.poles {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt(pole.k.re),
            fmt(pole.k.im),
            fmt(pole.z.re),
            fmt(pole.z.im),
            pole.multiplicity,
            pole.certified,
            pole.kind.label(),
        ));
    }
    out
}

/// CSV of matched pairs across the ladder:
/// `epsilon,re_resonance,im_resonance,re_eigenvalue,im_eigenvalue,abs_error`.
pub fn matches_csv(report: &ConvergenceReport) -> String {
    let mut out =
        String::from("epsilon,re_resonance,im_resonance,re_eigenvalue,im_eigenvalue,abs_error\n");
    for rung in &report.per_epsilon {
        for pair in &rung.matched {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt(rung.epsilon),
                fmt(pair.resonance.re),
                fmt(pair.resonance.im),
                fmt(pair.eigenvalue.re),
                fmt(pair.eigenvalue.im),
                fmt(pair.abs_error),
            ));
        }
    }
    out
}

/// CSV of a pseudospectrum table: `epsilon,re_z,im_z,norm` (norm may be
/// `inf` when z hits an eigenvalue exactly).
pub fn pseudospectrum_csv(table: &PseudospectrumTable) -> String {
    let mut out = String::from("epsilon,re_z,im_z,norm\n");
    for point in &table.points {
        for (eps, norm) in table.epsilons.iter().zip(&point.norms) {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt(*eps),
                fmt(point.z.re),
                fmt(point.z.im),
                fmt(*norm),
            ));
        }
    }
    out
}

/// Spectra of a convergence report as CSV documents (per-ε rows).
pub fn report_spectra_csv(report: &ConvergenceReport) -> String {
    let documents: Vec<SpectrumDocument> = report
        .per_epsilon
        .iter()
        .map(|rung| SpectrumDocument {
            epsilon: rung.epsilon,
            alpha: report.alpha,
            spectrum: rung.spectrum.clone(),
        })
        .collect();
    spectra_csv(&documents)
}

/// Write bytes, creating parent directories, with path-context errors.
pub fn write_artifact(path: &Path, contents: &str) -> Result<(), ExportError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| ExportError::Io {
                path: path.to_path_buf(),
                source,
            })?;
        }
    }
    std::fs::write(path, contents).map_err(|source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Serialize any artifact to pretty JSON at `path`.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), ExportError> {
    let text = serde_json::to_string_pretty(value).map_err(|source| ExportError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    write_artifact(path, &text)
}

/// Parse a JSON artifact from `path`.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ExportError> {
    let text = std::fs::read_to_string(path).map_err(|source| ExportError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ExportError::Json {
        path: path.to_path_buf(),
        source,
    })
}

const SVG_WIDTH: f64 = 720.0;
const SVG_HEIGHT: f64 = 540.0;
const SVG_MARGIN: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Static z-plane scatter of a convergence report: targets as crosses,
/// stable eigenvalues as dots colored per ε, axes and the sector edge
/// `arg z = −π/4` for orientation.
pub fn sweep_svg(report: &ConvergenceReport) -> String {
    // Data bounds over targets and stable eigenvalues, padded.
    let mut points: Vec<(f64, f64)> = report.targets.iter().map(|t| (t.z.re, t.z.im)).collect();
    for rung in &report.per_epsilon {
        points.extend(rung.spectrum.stable_eigenvalues().iter().map(|z| (z.re, z.im)));
    }
    if points.is_empty() {
        points.push((-1.0, -1.0));
        points.push((1.0, 1.0));
    }
    points.push((0.0, 0.0)); // keep the origin in frame for the axes
    let mut re_lo = f64::INFINITY;
    let mut re_hi = f64::NEG_INFINITY;
    let mut im_lo = f64::INFINITY;
    let mut im_hi = f64::NEG_INFINITY;
    for &(re, im) in &points {
        re_lo = re_lo.min(re);
        re_hi = re_hi.max(re);
        im_lo = im_lo.min(im);
        im_hi = im_hi.max(im);
    }
    let pad_re = 0.08 * (re_hi - re_lo).max(1e-3);
    let pad_im = 0.08 * (im_hi - im_lo).max(1e-3);
    re_lo -= pad_re;
    re_hi += pad_re;
    im_lo -= pad_im;
    im_hi += pad_im;

    let plot_w = SVG_WIDTH - 2.0 * SVG_MARGIN;
    let plot_h = SVG_HEIGHT - 2.0 * SVG_MARGIN;
    let x = |re: f64| SVG_MARGIN + (re - re_lo) / (re_hi - re_lo) * plot_w;
    let y = |im: f64| SVG_MARGIN + (im_hi - im) / (im_hi - im_lo) * plot_h;

    let mut svg = format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" ",
            "font-family=\"sans-serif\" font-size=\"12\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
        ),
        w = SVG_WIDTH,
        h = SVG_HEIGHT
    );

    // Axes through the origin.
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#444\" stroke-width=\"1\"/>\n",
        x(re_lo), y(0.0), x(re_hi), y(0.0)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#444\" stroke-width=\"1\"/>\n",
        x(0.0), y(im_lo), x(0.0), y(im_hi)
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#444\">Re z</text>\n",
        x(re_hi) - 36.0,
        y(0.0) - 6.0
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#444\">Im z</text>\n",
        x(0.0) + 6.0,
        y(im_hi) + 14.0
    ));

    // Sector edge arg z = −π/4 (the Davies ray for α = 0), dashed.
    let ray_len = re_hi.abs().max(im_lo.abs()).max(1.0);
    svg.push_str(&format!(
        concat!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" ",
            "stroke=\"#999\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n",
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#999\">arg z = -pi/4</text>\n"
        ),
        x(0.0),
        y(0.0),
        x(ray_len),
        y(-ray_len),
        x(0.55 * ray_len) + 4.0,
        y(-0.55 * ray_len) + 14.0
    ));

    // Stable eigenvalues, one color per ε rung.
    for (i, rung) in report.per_epsilon.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for z in rung.spectrum.stable_eigenvalues() {
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\" fill-opacity=\"0.8\"/>\n",
                x(z.re),
                y(z.im),
                color
            ));
        }
        svg.push_str(&format!(
            concat!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{}\"/>\n",
                "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#222\">eps = {}</text>\n"
            ),
            SVG_WIDTH - SVG_MARGIN - 130.0,
            SVG_MARGIN + 16.0 * i as f64,
            color,
            SVG_WIDTH - SVG_MARGIN - 120.0,
            SVG_MARGIN + 16.0 * i as f64 + 4.0,
            rung.epsilon
        ));
    }

    // Resonance targets as crosses, drawn last so they stay visible.
    for t in &report.targets {
        let (cx, cy) = (x(t.z.re), y(t.z.im));
        svg.push_str(&format!(
            concat!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" ",
                "stroke=\"black\" stroke-width=\"1.5\"/>\n",
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" ",
                "stroke=\"black\" stroke-width=\"1.5\"/>\n"
            ),
            cx - 5.0,
            cy - 5.0,
            cx + 5.0,
            cy + 5.0,
            cx - 5.0,
            cy + 5.0,
            cx + 5.0,
            cy - 5.0
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

/// Write the sweep scatter to disk.
pub fn write_sweep_svg(report: &ConvergenceReport, path: &Path) -> Result<(), ExportError> {
    write_artifact(path, &sweep_svg(report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_sweep, ResonanceSource, SweepConfig};
    use crate::potentials::{PiecewiseConstantPotential, Potential};
    use crate::resonance::{find_resonances, KRectangle, DEFAULT_NEWTON_TOL};
    use crate::C64;

    fn empty_spectrum() -> Spectrum {
        Spectrum {
            eigenvalues: Vec::new(),
            residuals: Vec::new(),
            stable: Vec::new(),
            config_digest: "d".into(),
        }
    }

    #[test]
    fn empty_spectrum_yields_header_only() {
        let doc = SpectrumDocument {
            epsilon: 0.25,
            alpha: 0.0,
            spectrum: empty_spectrum(),
        };
        assert_eq!(
            spectra_csv(&[doc]),
            "epsilon,alpha,index,re_z,im_z,residual,stable\n"
        );
    }

    #[test]
    fn spectra_rows_use_seventeen_digits() {
        let doc = SpectrumDocument {
            epsilon: 0.25,
            alpha: 0.0,
            spectrum: Spectrum {
                eigenvalues: vec![C64::new(1.0, -0.5)],
                residuals: vec![1e-15],
                stable: vec![true],
                config_digest: "d".into(),
            },
        };
        let csv = spectra_csv(&[doc]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "epsilon,alpha,index,re_z,im_z,residual,stable"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("2.5000000000000000e-1,0.0000000000000000e0,0,"));
        assert!(row.contains("1.0000000000000000e0"));
        assert!(row.contains("-5.0000000000000000e-1"));
        assert!(row.ends_with("true"));
    }

    #[test]
    fn resonance_csv_columns_and_kinds() {
        let p = PiecewiseConstantPotential::from_triples(&[(-1.0, 1.0, -4.0)]).unwrap();
        let rect = KRectangle::new(-0.2, 0.2, 0.05, 2.2);
        let set = find_resonances(&p, &rect, DEFAULT_NEWTON_TOL).unwrap();
        let csv = resonances_csv(&set);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "re_k,im_k,re_z,im_z,multiplicity,certified,kind"
        );
        for line in lines {
            assert!(line.ends_with("bound_state"));
            assert!(line.contains(",1,true,"));
        }
    }

    #[test]
    fn json_round_trip_preserves_resonance_set() {
        let p = PiecewiseConstantPotential::from_triples(&[(-1.0, 1.0, -4.0)]).unwrap();
        let rect = KRectangle::new(-0.2, 0.2, 0.05, 2.2);
        let set = find_resonances(&p, &rect, DEFAULT_NEWTON_TOL).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("set.json");
        write_json(&set, &path).unwrap();
        let back: ResonanceSet = read_json(&path).unwrap();
        assert_eq!(serde_json::to_string(&set).unwrap(), serde_json::to_string(&back).unwrap());
    }

    #[test]
    fn io_errors_carry_the_path() {
        // A regular file on the parent path defeats directory creation, so
        // the write must fail regardless of process privileges.
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("blocker");
        std::fs::write(&blocker, "not a directory").unwrap();
        let path = blocker.join("sub").join("out.csv");
        let err = write_artifact(&path, "x").unwrap_err();
        assert!(err.to_string().contains("out.csv"), "message: {err}");
    }

    #[test]
    fn svg_is_deterministic_and_marks_targets() {
        let mut cfg = SweepConfig::new(Potential::zero(), vec![0.25], 32);
        cfg.resonance_source = ResonanceSource::Explicit { poles: Vec::new() };
        let report = run_sweep(&cfg).unwrap();
        let a = sweep_svg(&report);
        let b = sweep_svg(&report);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("arg z = -pi/4"));
        assert!(a.contains("eps = 0.25"));
    }
}
