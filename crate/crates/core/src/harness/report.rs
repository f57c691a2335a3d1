use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::experiment::ExperimentRecord;

pub const CSV_HEADER: &str =
    "instance,na,nb,k,s,induced_before,prot_heur,prot_exact,gap_pct,ms_heur,ms_exact";

/// One row per record; a capped exact search leaves `prot_exact` and
/// `gap_pct` empty.
///
/// # Panics
///
/// If a record has the heuristic ahead of the exact optimum.
pub fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        if let Some(ex) = r.protected_exact {
            assert!(
                ex >= r.protected_heuristic,
                "instance {} s={}: exact {} below heuristic {}",
                r.instance,
                r.s,
                ex,
                r.protected_heuristic
            );
        }
        let exact = r.protected_exact.map(|v| v.to_string()).unwrap_or_default();
        let gap = r.gap_percent.map(|g| format!("{g:.2}")).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.3},{:.3}",
            r.instance,
            r.na,
            r.nb,
            r.k,
            r.s,
            r.induced_before,
            r.protected_heuristic,
            exact,
            gap,
            r.ms_heuristic,
            r.ms_exact
        );
    }
    out
}

const BAR: u32 = 28;
const GAP: u32 = 24;
const PLOT_H: u32 = 200;
const LEFT: u32 = 50;
const TOP: u32 = 40;
const HEUR_FILL: &str = "#4c72b0";
const EXACT_FILL: &str = "#dd8452";

/// Grouped bar chart for one instance: protected entities per budget, the
/// heuristic and the exact optimum side by side.
pub fn render_svg(records: &[ExperimentRecord]) -> String {
    let instance = records.first().map_or(0, |r| r.instance);
    let ymax = records
        .iter()
        .map(|r| r.induced_before.max(r.protected_heuristic))
        .max()
        .unwrap_or(0)
        .max(1) as u32;
    let groups = records.len() as u32;
    let width = LEFT + groups * (2 * BAR + GAP) + GAP + 130;
    let height = TOP + PLOT_H + 50;
    let base = TOP + PLOT_H;
    let y = |v: usize| base - (v as u32 * PLOT_H) / ymax;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
    let title = match records.first() {
        Some(r) => format!(
            "instance {instance}: |A|={} |B|={} k={} induced={}",
            r.na, r.nb, r.k, r.induced_before
        ),
        None => format!("instance {instance}"),
    };
    let _ = writeln!(s, r#"<text x="{LEFT}" y="20">{title}</text>"#);
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{base}" stroke="black"/>"#
    );
    let right = width - 130;
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{base}" x2="{right}" y2="{base}" stroke="black"/>"#
    );
    for tick in [0, ymax as usize / 2, ymax as usize] {
        let ty = y(tick);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{tick}</text>"#,
            LEFT - 6,
            ty + 4
        );
    }
    for (i, r) in records.iter().enumerate() {
        let x0 = LEFT + GAP + i as u32 * (2 * BAR + GAP);
        let bars = [
            (r.protected_heuristic, HEUR_FILL, x0),
            (r.protected_exact.unwrap_or(0), EXACT_FILL, x0 + BAR),
        ];
        for (j, (v, fill, x)) in bars.into_iter().enumerate() {
            if j == 1 && r.protected_exact.is_none() {
                let _ = writeln!(
                    s,
                    r#"<text x="{}" y="{}" text-anchor="middle">cap</text>"#,
                    x + BAR / 2,
                    base - 4
                );
                continue;
            }
            let top = y(v);
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{top}" width="{BAR}" height="{}" fill="{fill}"/>"#,
                base - top
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle">{v}</text>"#,
                x + BAR / 2,
                top - 4
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">s={}</text>"#,
            x0 + BAR,
            base + 18,
            r.s
        );
    }
    let lx = right + 16;
    for (k, (label, fill)) in [("heuristic", HEUR_FILL), ("exact", EXACT_FILL)]
        .into_iter()
        .enumerate()
    {
        let ly = TOP + 20 * k as u32;
        let _ = writeln!(
            s,
            r#"<rect x="{lx}" y="{ly}" width="12" height="12" fill="{fill}"/>"#
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}">{label}</text>"#, lx + 18, ly + 10);
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">modifications</text>"#,
        (LEFT + right) / 2,
        height - 8
    );
    s.push_str("</svg>\n");
    s
}

/// Writes `records.csv` and `instance_<id>.svg` files; returns the paths.
pub fn write_outputs(records: &[ExperimentRecord], dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv = dir.join("records.csv");
    fs::write(&csv, records_csv(records))?;
    written.push(csv);
    for group in records.chunk_by(|a, b| a.instance == b.instance) {
        let path = dir.join(format!("instance_{}.svg", group[0].instance));
        fs::write(&path, render_svg(group))?;
        written.push(path);
    }
    Ok(written)
}
