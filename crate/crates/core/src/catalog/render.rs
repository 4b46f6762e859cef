//! Canonical text form of a [`SpaceSpec`].

use std::fmt::Write;

use num_traits::{One, Zero};

use super::SpaceSpec;
use crate::TemplateMap;

fn map_section(out: &mut String, name: &str, map: &TemplateMap) {
    let _ = writeln!(out, "\n[{name}]");
    for (k, col) in map.columns().iter().enumerate() {
        if !col.is_zero() {
            let _ = writeln!(out, "{} -> {}", map.source().label(k), col.render());
        }
    }
}

/// Render a space; the output reparses to an equal spec.
pub fn render_space(spec: &SpaceSpec) -> String {
    let mut out = String::from("[space]\n");
    let _ = writeln!(out, "id = {}", spec.id);
    if let Some(d) = spec.config.q_degree() {
        let _ = writeln!(out, "q_degree = {d}");
    }
    let _ = writeln!(out, "basis = {}", spec.basis.labels().join(" "));
    let degrees: Vec<String> = spec.basis.degrees().iter().map(|d| d.to_string()).collect();
    let _ = writeln!(out, "degrees = {}", degrees.join(" "));
    let _ = writeln!(out, "maslov = {}", spec.maslov_shift());
    let _ = writeln!(out, "unit = {}", spec.unit);
    if let Some(g) = &spec.generator {
        let _ = writeln!(out, "generator = {g}");
    }
    if !spec.weight.slope.is_one() {
        let _ = writeln!(out, "weight_slope = {}", spec.weight.slope);
    }
    if !spec.weight.offset.is_zero() {
        let _ = writeln!(out, "weight_offset = {}", spec.weight.offset);
    }
    if let Some(p) = &spec.product {
        map_section(&mut out, "product", p);
    }
    map_section(&mut out, "seidel", &spec.seidel);
    if let Some(inv) = &spec.inverse {
        map_section(&mut out, "inverse", inv);
    }
    if !spec.seeds.is_empty() {
        out.push_str("\n[seeds]\n");
        for s in &spec.seeds {
            let _ = writeln!(out, "{}", s.render());
        }
    }
    if !spec.zeros.is_empty() {
        out.push_str("\n[zeros]\n");
        for z in &spec.zeros {
            let _ = writeln!(out, "{}", z.render());
        }
    }
    if let Some(l) = &spec.limit {
        out.push_str("\n[limit]\n");
        for (label, v) in l.labels.iter().zip(&l.vectors) {
            let _ = writeln!(out, "{label} -> {}", v.render());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::*;

    #[test]
    fn builtins_round_trip() {
        for spec in all_builtins(4) {
            let text = render_space(&spec);
            assert_eq!(parse_space(&text).unwrap(), spec, "{text}");
        }
        for n in 1..=3 {
            for spec in [projective_space_ansatz(n), taut_line_bundle_ansatz(n)] {
                let text = render_space(&spec);
                assert_eq!(parse_space(&text).unwrap(), spec, "{text}");
            }
        }
    }

    #[test]
    fn unknowns_rendered_with_marker() {
        let text = render_space(&taut_line_bundle_ansatz(1));
        assert!(text.contains("?c*q*u*e0"), "{text}");
        assert!(text.contains("?d*q*u*e0"), "{text}");
    }

    #[test]
    fn optional_sections_omitted() {
        let text = render_space(&complex_plane());
        for s in ["[product]", "[inverse]", "[seeds]", "[zeros]", "[limit]", "q_degree"] {
            assert!(!text.contains(s), "{text}");
        }
    }
}
