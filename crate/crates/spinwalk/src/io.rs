//! CSV and manifest emission. One CSV per observable with a header row,
//! UTF-8, LF line endings, floats printed as their shortest round-trip
//! decimal; plus a JSON run manifest (config echo, version, wall time).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::WalkConfig;
use crate::error::Result;
use crate::runner::ObservableSeries;
use crate::sweep::SweepResult;

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn push_row(out: &mut String, values: impl IntoIterator<Item = f64>) {
    let mut any = false;
    for v in values {
        if any {
            out.push(',');
        }
        let _ = write!(out, "{v}");
        any = true;
    }
    out.push('\n');
}

/// p.csv: t, x0..x{V−1}.
pub fn write_density_csv(path: &Path, series: &ObservableSeries) -> Result<()> {
    let num_nodes = series.density.first().map(Vec::len).unwrap_or(0);
    let mut out = String::from("t");
    for x in 0..num_nodes {
        let _ = write!(out, ",x{x}");
    }
    out.push('\n');
    for (t, row) in series.times.iter().zip(&series.density) {
        let _ = write!(out, "{t}");
        out.push(',');
        push_row(&mut out, row.iter().copied());
    }
    write_text(path, &out)
}

/// spin.csv: t, e0.sx, e0.sy, e0.sz, e1.sx, …
pub fn write_spin_csv(path: &Path, series: &ObservableSeries) -> Result<()> {
    let spins = series.spin.as_ref().expect("spin column requested");
    let mut out = String::from("t");
    for e in 0..series.num_edges {
        let _ = write!(out, ",e{e}.sx,e{e}.sy,e{e}.sz");
    }
    out.push('\n');
    for (t, row) in series.times.iter().zip(spins) {
        let _ = write!(out, "{t}");
        out.push(',');
        push_row(&mut out, row.iter().flat_map(|s| [s.sx, s.sy, s.sz]));
    }
    write_text(path, &out)
}

/// mean_spin.csv: t, sx, sy, sz.
pub fn write_mean_spin_csv(path: &Path, series: &ObservableSeries) -> Result<()> {
    let col = series
        .mean_spin
        .as_ref()
        .expect("mean_spin column requested");
    let mut out = String::from("t,sx,sy,sz\n");
    for (t, s) in series.times.iter().zip(col) {
        let _ = write!(out, "{t}");
        out.push(',');
        push_row(&mut out, [s.sx, s.sy, s.sz]);
    }
    write_text(path, &out)
}

/// entropy.csv: t, S_x, S_c, S_s.
pub fn write_entropy_csv(path: &Path, series: &ObservableSeries) -> Result<()> {
    let col = series.entropies.as_ref().expect("entropy column requested");
    let mut out = String::from("t,S_x,S_c,S_s\n");
    for (t, s) in series.times.iter().zip(col) {
        let _ = write!(out, "{t}");
        out.push(',');
        push_row(&mut out, s.iter().copied());
    }
    write_text(path, &out)
}

/// spin_set_entropy.csv: t, S_A.
pub fn write_spin_set_csv(path: &Path, series: &ObservableSeries) -> Result<()> {
    let col = series
        .spin_set_entropy
        .as_ref()
        .expect("spin_set column requested");
    let mut out = String::from("t,S_A\n");
    for (t, s) in series.times.iter().zip(col) {
        let _ = write!(out, "{t}");
        out.push(',');
        push_row(&mut out, [*s]);
    }
    write_text(path, &out)
}

/// concurrence.csv: t, then one column per ordered pair e1 < e2.
pub fn write_concurrence_csv(path: &Path, series: &ObservableSeries) -> Result<()> {
    let col = series
        .concurrence
        .as_ref()
        .expect("concurrence column requested");
    let ne = series.num_edges;
    let mut out = String::from("t");
    for e1 in 0..ne {
        for e2 in (e1 + 1)..ne {
            let _ = write!(out, ",c{e1}.{e2}");
        }
    }
    out.push('\n');
    for (t, matrix) in series.times.iter().zip(col) {
        let _ = write!(out, "{t}");
        out.push(',');
        let mut vals = Vec::with_capacity(ne * (ne - 1) / 2);
        for e1 in 0..ne {
            for e2 in (e1 + 1)..ne {
                vals.push(matrix[e1 * ne + e2]);
            }
        }
        push_row(&mut out, vals);
    }
    write_text(path, &out)
}

/// Long-form sweep CSV: theta, J, metric columns, and an error column for
/// cells that failed.
pub fn write_sweep_csv(path: &Path, result: &SweepResult) -> Result<()> {
    let mut out = String::from("theta,J,D_KS,S_x,S_c,S_s,mean_spin,error\n");
    for (it, &theta) in result.theta_values.iter().enumerate() {
        for (ij, &j) in result.j_values.iter().enumerate() {
            match result.cell(it, ij) {
                Ok(m) => {
                    let _ = writeln!(
                        out,
                        "{theta},{j},{},{},{},{},{},",
                        m.d_ks, m.s_x, m.s_c, m.s_s, m.mean_spin_norm
                    );
                }
                Err(msg) => {
                    let quoted = msg.replace('"', "\"\"");
                    let _ = writeln!(out, "{theta},{j},,,,,,\"{quoted}\"");
                }
            }
        }
    }
    write_text(path, &out)
}

#[derive(Serialize)]
struct Manifest<'a> {
    config: &'a WalkConfig,
    version: &'static str,
    wall_time_s: f64,
}

/// manifest.json next to the data files.
pub fn write_manifest(path: &Path, config: &WalkConfig, wall_time_s: f64) -> Result<()> {
    let manifest = Manifest {
        config,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s,
    };
    let text = serde_json::to_string_pretty(&manifest)?;
    write_text(path, &text)
}

/// Write every recorded column of a series under `dir`, returning the file
/// list.
pub fn write_series(dir: &Path, series: &ObservableSeries) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut emit = |name: &str, f: &dyn Fn(&Path, &ObservableSeries) -> Result<()>| -> Result<()> {
        let path = dir.join(name);
        f(&path, series)?;
        written.push(path);
        Ok(())
    };
    emit("p.csv", &write_density_csv)?;
    if series.spin.is_some() {
        emit("spin.csv", &write_spin_csv)?;
    }
    if series.mean_spin.is_some() {
        emit("mean_spin.csv", &write_mean_spin_csv)?;
    }
    if series.entropies.is_some() {
        emit("entropy.csv", &write_entropy_csv)?;
    }
    if series.spin_set_entropy.is_some() {
        emit("spin_set_entropy.csv", &write_spin_set_csv)?;
    }
    if series.concurrence.is_some() {
        emit("concurrence.csv", &write_concurrence_csv)?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::WalkConfig;
    use crate::runner::run_walk;

    #[test]
    fn density_csv_shape_and_row_sums() {
        let cfg = WalkConfig::uniform(5, 1.0, 0.5, "z", 100);
        let series = run_walk(&cfg.resolve().unwrap(), 1 << 30).unwrap();
        let dir = std::env::temp_dir().join("spinwalk_io_test");
        let path = dir.join("p.csv");
        write_density_csv(&path, &series).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(!text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x0,x1,x2,x3,x4");
        assert_eq!(lines.len(), 102); // header + t = 0..=100
        for line in &lines[1..] {
            let total: f64 = line
                .split(',')
                .skip(1)
                .map(|v| v.parse::<f64>().unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn reruns_are_byte_identical() {
        let cfg = WalkConfig::uniform(4, 0.7, 1.1, "x", 50);
        let series1 = run_walk(&cfg.resolve().unwrap(), 1 << 30).unwrap();
        let series2 = run_walk(&cfg.resolve().unwrap(), 1 << 30).unwrap();
        let dir = std::env::temp_dir().join("spinwalk_io_rerun");
        write_density_csv(&dir.join("a.csv"), &series1).unwrap();
        write_density_csv(&dir.join("b.csv"), &series2).unwrap();
        let a = std::fs::read(dir.join("a.csv")).unwrap();
        let b = std::fs::read(dir.join("b.csv")).unwrap();
        assert_eq!(a, b);
        std::fs::remove_dir_all(&dir).ok();
    }
}
