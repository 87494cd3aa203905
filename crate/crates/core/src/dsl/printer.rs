use std::fmt::Write as _;

use crate::algebra::rational::format_rational;
use crate::algebra::{LaurentPoly, Matrix};
use crate::calculus::{DiffForm, VectorField};
use crate::document::Document;

/// `dX`, or `d(X)` when a user name shadows the differential.
fn differential(doc: &Document, coord: &str) -> String {
    let plain = format!("d{coord}");
    if doc.defines(&plain) {
        format!("d({coord})")
    } else {
        plain
    }
}

fn blade_text(doc: &Document, blade: &[usize]) -> String {
    let chart = &doc.chart;
    blade
        .iter()
        .map(|&k| differential(doc, chart.coordinate_name(chart.free()[k])))
        .collect::<Vec<_>>()
        .join("^")
}

fn form_text(doc: &Document, form: &DiffForm) -> String {
    if form.is_zero() {
        let k = form.degree();
        if k == 0 {
            return "0".to_string();
        }
        let dim = doc.chart.dim();
        let top = k.min(dim);
        let blade: Vec<usize> = (0..top).collect();
        let mut text = format!("0 {}", blade_text(doc, &blade));
        for _ in top..k {
            text = format!("d({text})");
        }
        return text;
    }
    form.terms()
        .map(|(b, c)| {
            if b.is_empty() {
                format!("({c})")
            } else {
                format!("({c}) {}", blade_text(doc, b))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn field_text(doc: &Document, field: &VectorField) -> String {
    let terms: Vec<String> = field
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("({c}) d/d{}", doc.chart.coordinate_name(i)))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn matrix_text(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let entries: Vec<String> = (0..m.cols()).map(|c| format_rational(&m[(r, c)])).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Canonical source text for a document.
pub fn print(doc: &Document) -> String {
    let chart = &doc.chart;
    let vars = chart.vars();
    let mut out = String::new();
    let coords: Vec<String> = (0..vars.len())
        .map(|i| {
            let star = if chart.is_invertible(i) { "*" } else { "" };
            format!("{}{star}", vars.name(i))
        })
        .collect();
    let _ = writeln!(out, "chart {{\n    vars {};", coords.join(", "));
    for r in chart.relations() {
        let _ = writeln!(out, "    rel {} solve {};", r.poly, vars.name(r.solve_for));
    }
    out.push_str("}\n");

    let mut section = String::new();
    if let Some((name, v)) = &doc.volume {
        let _ = writeln!(section, "volume {name} = {};", form_text(doc, v.form()));
    }
    for (name, f) in &doc.forms {
        let _ = writeln!(section, "form {name} = {};", form_text(doc, f));
    }
    push_section(&mut out, &mut section);
    for (name, f) in &doc.fields {
        let _ = writeln!(section, "field {name} = {};", field_text(doc, f));
    }
    push_section(&mut out, &mut section);
    for (name, a) in &doc.actions {
        let images: Vec<String> = a
            .images()
            .iter()
            .enumerate()
            .filter(|(i, img)| **img != doc.chart.nf(&LaurentPoly::var_index(vars, *i)))
            .map(|(i, img)| format!("{} -> {img}", vars.name(i)))
            .collect();
        let sep = if images.is_empty() { "" } else { " " };
        let _ = writeln!(section, "action {name}:{sep}{} order {};", images.join(", "), a.order());
    }
    for (name, p) in &doc.points {
        let vals: Vec<String> = p
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{} = {}", vars.name(i), format_rational(v)))
            .collect();
        let _ = writeln!(section, "point {name}: {};", vals.join(", "));
    }
    push_section(&mut out, &mut section);
    for (name, g) in &doc.groups {
        let _ = writeln!(section, "group {name} {{\n    size {};", g.size());
        if !g.basis().is_empty() {
            let b: Vec<String> = g.basis().iter().map(matrix_text).collect();
            let _ = writeln!(section, "    basis {};", b.join(", "));
        }
        for (e, m) in g.elements() {
            let _ = writeln!(section, "    element {e} = {};", matrix_text(m));
        }
        section.push_str("}\n");
    }
    push_section(&mut out, &mut section);
    for c in &doc.checks {
        let _ = writeln!(section, "check {c};");
    }
    push_section(&mut out, &mut section);
    out
}

fn push_section(out: &mut String, section: &mut String) {
    if !section.is_empty() {
        out.push('\n');
        out.push_str(section);
        section.clear();
    }
}
