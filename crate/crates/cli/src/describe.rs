//! Seed-length tables: component trees for the desk profile, formula
//! totals for the honest profile. Neither path emits a single bit.

use crate::suite::{build_generator, GeneratorSpec};
use generators::{
    descriptor, honest_hash_chunk, honest_locally_monotone_shape, honest_short_xor_shape,
    honest_width3_shape,
};
use restrictions::ParamConfig;
use smallbias::SeedReport;

fn render_report(report: &SeedReport, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    out.push_str(&format!(
        "{pad}{} [{}] {} bits\n",
        report.component, report.construction, report.bits
    ));
    for child in &report.children {
        render_report(child, depth + 1, out);
    }
}

/// Desk profile: instantiate the generator and print its seed tree.
pub fn describe_desk(spec: &GeneratorSpec, n: usize) -> Result<String, String> {
    let cfg = ParamConfig::desk();
    let gen = build_generator(spec, n, &cfg).map_err(|e| match e {
        crate::suite::BuildFailure::Soft(m) | crate::suite::BuildFailure::Hard(m) => m,
    })?;
    let d = descriptor(gen.as_ref());
    let mut out = format!("kind {}  n {}  total {} bits (desk)\n", d.kind, d.n, d.seed_bits);
    render_report(&d.report, 1, &mut out);
    Ok(out)
}

/// Honest profile: closed-form totals only, in log2 bits where the shape
/// reports them that way. Returns the headline total alongside the text.
pub fn describe_honest(spec: &GeneratorSpec, n: usize) -> Result<(f64, String), String> {
    let cfg = ParamConfig::honest();
    let eps = spec.eps.unwrap_or(0.25);
    let (total, body) = match spec.kind.as_str() {
        "uniform" => (n as f64, format!("  one fresh bit per coordinate: {n} bits\n")),
        "small-bias" => {
            // powering construction at field power ceil(log2(n/eps))
            let k = (n.max(2) as f64 / eps).log2().ceil().max(1.0);
            (
                2.0 * k,
                format!("  small-bias powering, field power {k}: {} bits\n", 2.0 * k),
            )
        }
        "hash-tree" => {
            let chunk = honest_hash_chunk(n, 4, eps) as f64;
            let leaves = (n as f64 / chunk).ceil().max(1.0);
            let levels = leaves.log2().ceil().max(0.0);
            let total = chunk * (1.0 + 2.0 * levels);
            (
                total,
                format!("  chunk {chunk}, {levels} doubling levels: {total} bits\n"),
            )
        }
        "short-xor" | "read-once-poly-prg" => {
            let (w, b) = match spec.kind.as_str() {
                "short-xor" => (
                    spec.w.unwrap_or(3),
                    spec.b.unwrap_or_else(|| {
                        (n.max(2) as f64 / eps).log2().ceil().max(1.0) as u32
                    }),
                ),
                _ => {
                    let e2 = eps / (8.0 * n.max(1) as f64);
                    (2, (n.max(2) as f64 / e2).log2().ceil().max(1.0) as u32)
                }
            };
            let shape = honest_short_xor_shape(n, w, b, eps, &cfg);
            let text = serde_json::to_string_pretty(&shape).expect("shape json");
            (shape.total_bits, indent_json(&text))
        }
        "width3-prg" => {
            let shape = honest_width3_shape(n, eps, &cfg);
            let text = serde_json::to_string_pretty(&shape).expect("shape json");
            (shape.total_bits, indent_json(&text))
        }
        "locally-monotone-prg" => {
            let shape = honest_locally_monotone_shape(n, eps, &cfg);
            let text = serde_json::to_string_pretty(&shape).expect("shape json");
            (shape.total_bits, indent_json(&text))
        }
        other => return Err(format!("unknown generator kind {other:?}")),
    };
    let mut out = format!(
        "kind {}  n {}  total {:.2} bits (honest, formula only)\n",
        spec.kind, n, total
    );
    out.push_str(&body);
    Ok((total, out))
}

fn indent_json(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        out.push_str("  ");
        out.push_str(line);
        out.push('\n');
    }
    out
}

/// Honest totals over a sweep of input lengths; used to eyeball growth.
pub fn honest_sweep(spec: &GeneratorSpec, ns: &[usize]) -> Result<Vec<(usize, f64)>, String> {
    ns.iter()
        .map(|&n| describe_honest(spec, n).map(|(total, _)| (n, total)))
        .collect()
}
