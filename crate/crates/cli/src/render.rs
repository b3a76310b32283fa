//! Plain-text layout of a monad: one matrix row per line, `|` between the
//! column blocks of `f` and a rule between the row blocks of `g`.

use std::fmt::Write;

use monadforge::{MonadSpec, PolyMatrix};

fn cell_width(m: &PolyMatrix) -> usize {
    m.entries().iter().map(|p| p.to_string().chars().count()).max().unwrap_or(1)
}

fn pad(s: &str, width: usize) -> String {
    format!("{s:<width$}")
}

pub fn monad_text(spec: &MonadSpec) -> String {
    let ranges = spec.block_ranges();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "monad on P^{n} x P^{n} x P^{m} x P^{m}, k = {k}",
        n = spec.params().n(),
        m = spec.params().m(),
        k = spec.params().k()
    );
    let _ = writeln!(out, "{} --f--> {} --g--> {}", spec.source(), spec.middle(), spec.target());

    let f = spec.f();
    let w = cell_width(f);
    let _ = writeln!(out, "\nf ({}x{}):", f.rows(), f.cols());
    for i in 0..f.rows() {
        let blocks: Vec<String> = ranges
            .iter()
            .map(|(_, r)| r.clone().map(|j| pad(&f.get(i, j).to_string(), w)).collect::<Vec<_>>().join(" "))
            .collect();
        let _ = writeln!(out, "{}", blocks.join(" | ").trim_end());
    }

    let g = spec.g();
    let w = cell_width(g);
    let line_len = g.cols() * (w + 1) - 1;
    let _ = writeln!(out, "\ng ({}x{}):", g.rows(), g.cols());
    for (b, (_, r)) in ranges.iter().enumerate() {
        if b > 0 {
            let _ = writeln!(out, "{}", "-".repeat(line_len));
        }
        for i in r.clone() {
            let row: Vec<String> = (0..g.cols()).map(|j| pad(&g.get(i, j).to_string(), w)).collect();
            let _ = writeln!(out, "{}", row.join(" ").trim_end());
        }
    }
    out
}
