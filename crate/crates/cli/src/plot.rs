//! Plot-script emission: writes a self-contained matplotlib script that
//! renders the result CSVs (eigenvalue curves, distance-vs-T, per-block
//! error vs n). The script is data-driven; every number it draws comes
//! from the CSV files.

use std::path::Path;

use crate::runner::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CsvKind {
    Spectrum,
    Anneal,
    Trotter,
}

fn classify(header: &[String]) -> Option<CsvKind> {
    let names: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    if names.first() == Some(&"t")
        && names.last() == Some(&"gap")
        && names.iter().any(|n| n.starts_with("lambda_"))
    {
        return Some(CsvKind::Spectrum);
    }
    if names == ["T", "steps", "dist_to_opt", "unitarity_defect"] {
        return Some(CsvKind::Anneal);
    }
    if names.first() == Some(&"n") && names.contains(&"max_block_error") {
        return Some(CsvKind::Trotter);
    }
    None
}

/// Validates the given CSVs and writes `plot.py` next to them.
pub fn emit_plot_script(files: &[String], out_dir: &Path) -> Result<String, CliError> {
    if files.is_empty() {
        return Err(CliError::config("plot needs at least one CSV file"));
    }
    for file in files {
        let text = std::fs::read_to_string(file)
            .map_err(|e| CliError::io(format!("cannot read {file}: {e}")))?;
        let header: Vec<String> = text
            .lines()
            .next()
            .unwrap_or("")
            .split(',')
            .map(|s| s.to_string())
            .collect();
        if classify(&header).is_none() {
            return Err(CliError::config(format!(
                "{file}: unrecognized or missing columns {header:?}"
            )));
        }
    }

    let file_list = files
        .iter()
        .map(|f| format!("    {:?},", f))
        .collect::<Vec<_>>()
        .join("\n");
    let script = PLOT_TEMPLATE.replace("@FILES@", &file_list);
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join("plot.py");
    std::fs::write(&path, script)
        .map_err(|e| CliError::io(format!("cannot write plot.py: {e}")))?;
    Ok(path.to_string_lossy().into_owned())
}

const PLOT_TEMPLATE: &str = r#"#!/usr/bin/env python3
"""Render result CSVs to PNG figures.

Usage: python3 plot.py [csv ...]
Without arguments, the files recorded at emission time are used.
Relative paths are resolved against this script's directory.
"""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

FILES = [
@FILES@
]


def resolve(path):
    if os.path.isabs(path):
        return path
    here = os.path.dirname(os.path.abspath(__file__))
    candidate = os.path.join(here, path)
    return candidate if os.path.exists(candidate) else path


def load(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    data = [[float(x) for x in row] for row in rows[1:]]
    return header, data


def plot_spectrum(path, header, data):
    t = [r[0] for r in data]
    n_levels = len(header) - 2
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(11, 4.2))
    for j in range(1, n_levels):
        ax0.plot(t, [r[j] for r in data], color="0.6", lw=0.8)
    ax0.plot(t, [r[n_levels] for r in data], color="crimson", lw=1.8,
             label="top level")
    ax0.set_xlabel("t")
    ax0.set_ylabel("eigenvalues")
    ax0.legend(loc="best")
    gap = [max(r[-1], 1e-18) for r in data]
    ax1.semilogy(t, gap, color="navy")
    ax1.set_xlabel("t")
    ax1.set_ylabel("gap")
    fig.suptitle(os.path.basename(path))
    fig.tight_layout()
    out = path + ".png"
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out


def plot_anneal(path, header, data):
    t_values = [r[0] for r in data]
    dist = [max(r[2], 1e-18) for r in data]
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.loglog(t_values, dist, "o-", color="navy")
    ax.set_xlabel("T")
    ax.set_ylabel("distance to optimal span")
    ax.set_title(os.path.basename(path))
    fig.tight_layout()
    out = path + ".png"
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out


def plot_trotter(path, header, data):
    idx = {name: k for k, name in enumerate(header)}
    n_values = [r[idx["n"]] for r in data]
    block = [max(r[idx["max_block_error"]], 1e-18) for r in data]
    total = [max(r[idx["total_error"]], 1e-18) for r in data]
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.loglog(n_values, block, "o-", label="max per-block error")
    ax.loglog(n_values, total, "s-", label="total error")
    ax.set_xlabel("n (slices per block)")
    ax.set_ylabel("operator-norm error")
    ax.legend(loc="best")
    ax.set_title(os.path.basename(path))
    fig.tight_layout()
    out = path + ".png"
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out


def main(argv):
    files = argv[1:] if len(argv) > 1 else FILES
    for raw in files:
        path = resolve(raw)
        header, data = load(path)
        if header and header[0] == "t" and header[-1] == "gap":
            out = plot_spectrum(path, header, data)
        elif header[:3] == ["T", "steps", "dist_to_opt"]:
            out = plot_anneal(path, header, data)
        elif header and header[0] == "n" and "max_block_error" in header:
            out = plot_trotter(path, header, data)
        else:
            raise SystemExit(f"{path}: unrecognized columns {header}")
        print(out)


if __name__ == "__main__":
    main(sys.argv)
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_headers() {
        let spectrum: Vec<String> = ["t", "lambda_1", "lambda_2", "gap"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(classify(&spectrum), Some(CsvKind::Spectrum));
        let anneal: Vec<String> = ["T", "steps", "dist_to_opt", "unitarity_defect"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(classify(&anneal), Some(CsvKind::Anneal));
        let trotter: Vec<String> = [
            "n",
            "max_block_error",
            "discretization_error",
            "total_error",
            "dist_to_opt",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(classify(&trotter), Some(CsvKind::Trotter));
        let junk: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(classify(&junk), None);
    }
}
