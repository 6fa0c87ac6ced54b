use fairnav_core::{Front, PathAudit};
use std::fmt::Write;

const BAR_WIDTH: usize = 24;

fn bar(share: f64) -> String {
    let filled = ((share.clamp(0.0, 1.0) * BAR_WIDTH as f64).round()) as usize;
    format!("{}{}", "#".repeat(filled), ".".repeat(BAR_WIDTH - filled))
}

pub fn front_table(front: &Front) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>4}  {:>10}  {:>12}  {:>5}", "k", "efficiency", "unfairness", "moves");
    for (k, s) in front.solutions().iter().enumerate() {
        let _ = writeln!(
            out,
            "{:>4}  {:>10}  {:>12.6}  {:>5}",
            k,
            s.efficiency,
            s.unfairness,
            s.path.moves()
        );
    }
    out
}

pub fn audit(audit: &PathAudit, header: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{header}");
    let _ = writeln!(out, "found {} people (attribute `{}`)", audit.found_total, audit.attribute);
    if let Some(u) = audit.unfairness {
        let _ = writeln!(out, "unfairness {u:.6}");
    }
    let _ = writeln!(out);
    let name_width = audit.categories.iter().map(|c| c.len()).max().unwrap_or(0).max(8);
    let _ = writeln!(
        out,
        "{:<name_width$}  {:>8}  {:>8}  {:<w$}  city share",
        "category",
        "found",
        "utility",
        "path share",
        w = BAR_WIDTH + 8,
    );
    let path = audit.path_distribution.mass();
    let city = audit.city_distribution.mass();
    for (k, name) in audit.categories.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>8}  {:>8.4}  {}  {:>6.4}  {}  {:>6.4}",
            name,
            audit.found[k],
            audit.utility[k],
            bar(path[k]),
            path[k],
            bar(city[k]),
            city[k],
        );
    }
    out
}
