//! Report rendering: a terse text summary, lossless JSON, and LaTeX of the
//! constructed systems.

use crate::run::{Report, Status};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => text(report),
        Format::Json => json(report),
        Format::Latex => latex(report),
    }
}

pub fn json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn label(name: &str, instance: Option<usize>) -> String {
    match instance {
        Some(i) => format!("{name}[{i}]"),
        None => name.to_string(),
    }
}

fn text(r: &Report) -> String {
    let c = &r.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "nfold report: seed {}, random trials {}, jet budget {}",
        c.seed, c.random_trials, c.max_jet_order
    );
    for e in &r.checks {
        let tag = match e.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let _ = writeln!(out, "{tag} {} ({} ms)", label(&e.name, e.instance), e.elapsed_ms);
        if let Some(res) = &e.residual {
            let _ = writeln!(out, "     residual: {res}");
        }
        if let Some(d) = &e.detail {
            let _ = writeln!(out, "     note: {d}");
        }
    }
    let _ = writeln!(
        out,
        "{} passed, {} failed, {} skipped; max jet order {}, peak terms {}",
        r.count(Status::Pass),
        r.count(Status::Fail),
        r.count(Status::Skipped),
        r.stats.max_jet_order,
        r.stats.peak_terms
    );
    out
}

fn latex(r: &Report) -> String {
    let mut out = String::new();
    out.push_str("\\begin{tabular}{lll}\n\\textbf{check} & \\textbf{instance} & \\textbf{status} \\\\\n\\hline\n");
    for e in &r.checks {
        let inst = e.instance.map_or("--".to_string(), |i| i.to_string());
        let status = match e.status {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        };
        let _ = writeln!(out, "\\texttt{{{}}} & {inst} & {status} \\\\", e.name);
    }
    out.push_str("\\end{tabular}\n");
    for s in &r.systems {
        let rows: Vec<String> = s.omega.iter().map(|r| r.join(" & ")).collect();
        let _ = writeln!(
            out,
            "\n\\paragraph{{Instance {}.}} $\\Omega = \\begin{{pmatrix}} {} \\end{{pmatrix}}$, $f(z) = {}$.",
            s.instance,
            rows.join(" \\\\ "),
            s.f
        );
        out.push_str("\\begin{align*}\n");
        let _ = writeln!(out, "A(z) &= {} \\\\", s.a);
        let _ = writeln!(out, "B(z) &= {} \\\\", s.b);
        let _ = writeln!(out, "C(z) &= {} \\\\", s.c);
        let _ = writeln!(out, "\\tilde{{H}}^{{-}} &= {} \\\\", s.h_minus);
        let _ = write!(out, "\\tilde{{P}}_3^{{-}} &= {}", s.p3_minus_gauged);
        if let (Some(vp), Some(vm), Some(p)) = (&s.v_plus, &s.v_minus, &s.p3_minus) {
            let _ = write!(out, " \\\\\nV^{{+}}(q) &= {vp} \\\\\nV^{{-}}(q) &= {vm} \\\\\nP_3^{{-}} &= {p}");
        }
        out.push_str("\n\\end{align*}\n");
        if let Some(n) = &s.note {
            let _ = writeln!(out, "% {n}");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::run::run;

    fn report() -> Report {
        let cfg = parse_config(br#"{"omega": [["1","0","0"],["0","2","0"],["0","0","3"]], "f": "z^3", "checks": ["preservation", "typea-limit"]}"#)
            .unwrap();
        run(&cfg, 6)
    }

    #[test]
    fn json_round_trip() {
        let r = report();
        let back: Report = serde_json::from_str(&json(&r)).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn text_and_latex_shapes() {
        let r = report();
        let t = render(&r, Format::Text);
        assert!(t.contains("PASS preservation[0]"));
        assert!(t.contains("SKIP typea-limit"));
        assert!(t.contains("1 passed, 0 failed, 1 skipped"));
        let l = render(&r, Format::Latex);
        assert!(l.contains("V^{+}(q) &="));
        assert!(l.contains("\\tilde{P}_3^{-} &= s^{3}"));
        assert!(l.contains("f(z) = z^{3}") || l.contains("f(z) = z^3"), "{l}");
    }
}
